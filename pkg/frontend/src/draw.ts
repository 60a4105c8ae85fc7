// Paint a Scene onto a 2D canvas through a Viewport. Badges are drawn in
// screen space; everything else is world-space millimetres.

import { Scene, Shape } from "./scene.js";
import { Viewport, toScreen } from "./view.js";

const BACKGROUND = "#10151c";

export function paint(ctx: CanvasRenderingContext2D, scene: Scene,
                      view: Viewport, width: number, height: number): void {
  ctx.fillStyle = BACKGROUND;
  ctx.fillRect(0, 0, width, height);
  for (const shape of scene.shapes) {
    drawShape(ctx, shape, view, width);
  }
}

function drawShape(ctx: CanvasRenderingContext2D, shape: Shape,
                   view: Viewport, width: number): void {
  switch (shape.kind) {
    case "circle": {
      const [sx, sy] = toScreen(view, shape.x, shape.y);
      ctx.save();
      ctx.globalAlpha = shape.alpha ?? 1.0;
      ctx.beginPath();
      ctx.arc(sx, sy, shape.radius * view.scale, 0, 2 * Math.PI);
      if (shape.fill) {
        ctx.fillStyle = shape.fill;
        ctx.fill();
      }
      if (shape.stroke) {
        ctx.strokeStyle = shape.stroke;
        ctx.lineWidth = shape.lineWidth ?? 1;
        ctx.setLineDash(shape.dashed ? [6, 6] : []);
        ctx.stroke();
      }
      ctx.restore();
      break;
    }
    case "polyline": {
      ctx.save();
      ctx.strokeStyle = shape.stroke;
      ctx.lineWidth = shape.lineWidth;
      ctx.lineJoin = "round";
      ctx.lineCap = "round";
      ctx.beginPath();
      shape.points.forEach(([x, y], i) => {
        const [sx, sy] = toScreen(view, x, y);
        if (i === 0) ctx.moveTo(sx, sy);
        else ctx.lineTo(sx, sy);
      });
      ctx.stroke();
      ctx.restore();
      break;
    }
    case "label": {
      const [sx, sy] = toScreen(view, shape.x, shape.y);
      ctx.save();
      ctx.fillStyle = shape.color;
      ctx.font = "600 12px system-ui, sans-serif";
      ctx.textAlign = shape.anchor === "left" ? "left" : "center";
      ctx.textBaseline = "middle";
      ctx.fillText(shape.text, sx, sy);
      ctx.restore();
      break;
    }
    case "badge": {
      const pad = 8;
      const y = 16 + shape.slot * 34;
      ctx.save();
      ctx.font = `${shape.emphasis ? 700 : 500} ${shape.emphasis ? 18 : 14}px system-ui, sans-serif`;
      const w = ctx.measureText(shape.text).width + 2 * pad;
      const x = width - w - 16;
      ctx.globalAlpha = 0.92;
      ctx.fillStyle = shape.emphasis ? shape.color : "#1c2430";
      roundRect(ctx, x, y, w, 26, 6);
      ctx.fill();
      ctx.globalAlpha = 1.0;
      ctx.fillStyle = shape.emphasis ? "#ffffff" : shape.color;
      ctx.textAlign = "left";
      ctx.textBaseline = "middle";
      ctx.fillText(shape.text, x + pad, y + 13);
      ctx.restore();
      break;
    }
  }
}

function roundRect(ctx: CanvasRenderingContext2D, x: number, y: number,
                   w: number, h: number, r: number): void {
  ctx.beginPath();
  ctx.moveTo(x + r, y);
  ctx.arcTo(x + w, y, x + w, y + h, r);
  ctx.arcTo(x + w, y + h, x, y + h, r);
  ctx.arcTo(x, y + h, x, y, r);
  ctx.arcTo(x, y, x + w, y, r);
  ctx.closePath();
}
